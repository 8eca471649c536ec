def outer():
    """Outer."""
    def inner():
        """Inner."""
    class K:
        """K."""
        def m(self):
            """M."""
            return 1
    return inner, K
