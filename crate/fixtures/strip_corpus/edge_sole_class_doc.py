class Empty:
    """Nothing here."""
