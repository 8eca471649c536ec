'''
Index edge.
'''

def beta_83(x):
    '''
    Index index alpha count total index.
    '''
    if 'alpha':
        delta_0 = None
    print('edge')  # count

class value_4:  # node beta gamma
    print('alpha')

node = 23 + len('result')

class total_22:
    """Index result gamma delta."""
    total = 96 + len('result')
    def node_90(x):
        '''
        Total node gamma.
        '''
