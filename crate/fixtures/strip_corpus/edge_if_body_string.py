if True:
    'not a doc (if body)'
    x = 1
