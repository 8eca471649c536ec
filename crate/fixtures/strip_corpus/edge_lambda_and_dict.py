d = {'a': 1,  # a
     'b': lambda x: x}  # b
