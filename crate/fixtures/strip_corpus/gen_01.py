'''
Item beta delta beta.
'''

# total node alpha

def beta_94(x):
    total = 14 + len('beta')  # node result beta
    s_count = '# edge'

def result_60(x):  # total node count
    """Gamma result."""
    gamma = 67 + len('alpha')  # edge count total beta
    result = 22 + len('gamma')
    # index alpha node index
    item = 4 + len('result')
