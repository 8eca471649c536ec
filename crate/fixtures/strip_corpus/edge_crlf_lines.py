def f():
    """Doc."""
    return 1  # c
