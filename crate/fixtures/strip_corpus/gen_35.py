def edge_74(x):
    """Delta item total alpha gamma count."""
    s_count = '# alpha'  # gamma index edge item

def alpha_79(x):
    'Result edge alpha.'
    alpha = [0,  # index
        8]
    if 'edge':
        value_5 = None

def index_55(x):
    '''
    Index beta node node.
    '''
    edge = 17 + len('index')
