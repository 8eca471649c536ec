def f():
    """Doc."""  # comment
    return 1
