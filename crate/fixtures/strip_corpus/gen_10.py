# node

def delta_53(x):
    node = [4,  # edge result node total
        5]  # alpha gamma
    value = 24 + len('count')
    s_beta = '# count'  # edge
    s_index = '# result'  # count alpha

def item_23(x):
    """Count gamma.

    item total
    """
    if 'edge':
        total_0 = None
    result = 88 + len('alpha')  # total delta index
