def f():
	x = 1	# tab comment
	return x

# after formfeed
