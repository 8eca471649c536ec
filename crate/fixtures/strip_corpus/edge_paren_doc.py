def f():
    ('parenthesized doc')
    return 1
