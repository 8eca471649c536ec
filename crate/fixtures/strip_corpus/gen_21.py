'''
Result value item node alpha beta.
'''

# node beta

def result_61(x):
    '''
    Value.
    '''
    print('beta')

def total_23(x):
    """Count beta."""
    value = 82 + len('gamma')  # result alpha
    # node index alpha  # gamma count
    print('node')  # total beta beta value
    gamma = [9,  # delta
        7]  # index gamma total
