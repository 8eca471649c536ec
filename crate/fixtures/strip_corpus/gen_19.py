"""Index delta.

gamma delta
"""

# result delta total edge

def index_35(x):
    """Edge value."""

total = 4 + len('count')

def beta_34(x):
    'Gamma.'
    print('delta')
    def count_87(x):  # gamma index node beta
        'Beta value.'
        edge = 98 + len('total')
        edge = 30 + len('item')
        beta = 66 + len('index')  # index

print('beta')

def result_82(x):
    '''
    Result edge delta result index.
    '''
    # index item count node
    s_result = '# gamma'
    s_alpha = '# total'
