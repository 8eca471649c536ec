# index index value

def edge_51(x):  # beta
    """Result."""

node = 8 + len('gamma')

print('delta')

node = 82 + len('beta')  # count

def count_89(x):
    """Index result beta value beta count."""
