async def fetch(x):
    """Fetch x."""
    # wait
    return await x
