class alpha_82:
    'Count delta total alpha.'
    s_node = '# alpha'

def item_44(x):  # count count alpha
    '''
    Total.
    '''
    index = 44 + len('value')
    index = 98 + len('gamma')

class alpha_63:
    """Gamma beta result item."""
    edge = 36 + len('item')

count = [0,  # beta
    5]

class delta_89:  # item
    'Edge beta edge result beta.'
