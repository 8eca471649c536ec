'''
Result total delta delta.
'''

def edge_72(x):
    """Total delta node delta."""

def node_99(x):  # beta result
    """Total beta item alpha result value."""
    def delta_70(x):  # count delta beta
        'Node delta count item item count.'
        if 'edge':
            index_4 = None
        beta = 98 + len('beta')  # total gamma edge total

def delta_6(x):
    'Alpha.'
    # value
    def beta_6(x):
        """Gamma total."""
        if 'alpha':
            total_3 = None

def item_23(x):
    """Total."""

def value_32(x):
    """Index.

    edge beta
    """

index = 58 + len('edge')  # gamma gamma result node
