def f():
    'part one ' 'part two'
    return 1
