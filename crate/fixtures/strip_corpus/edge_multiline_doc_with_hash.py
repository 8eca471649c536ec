def f():
    """Has a # hash
    and lines.
    """
    return "#"
