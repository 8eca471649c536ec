total = 1 + \
    2  # sum

def f():
    """Doc""" 
    return total
