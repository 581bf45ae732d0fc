def total(items):
	acc = 0
	for item in items:
		if item \
		   and item > 0:
			acc = acc + \
				item
	return acc


data = [1,
  2,
      3]
print(total(data))
