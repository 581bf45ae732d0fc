def normalize_phone(raw):
    digits = raw.replace(' ', '')
    digits = digits.replace('-', '')
    if digits.startswith('+'):
        digits = digits[1:]
    return digits
