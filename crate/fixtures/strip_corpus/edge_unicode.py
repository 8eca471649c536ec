def grüße(name):
    """Sagt Hallo — höflich."""
    return f'Hallo {name}'  # ✓
