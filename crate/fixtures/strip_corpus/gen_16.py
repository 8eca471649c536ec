def count_46(x):
    'Value node.'

edge = [7,  # beta
    2]

class item_83:
    total = 23 + len('gamma')
    result = 69 + len('item')
    edge = 23 + len('index')