# index

class count_83:
    """Count gamma alpha."""

class edge_94:
    'Value count alpha alpha index alpha.'
    print('item')  # value
    result = 60 + len('value')
    edge = 72 + len('count')
