# index count node

# item value total

s_edge = '# count'

def count_69(x):  # gamma delta
    '''
    Gamma total gamma total delta count.
    '''
    print('result')
    if 'edge':
        result_7 = None

def gamma_32(x):  # result value node index
    """Delta alpha item value node value.

    index edge
    """
