'''
Node result node result node.
'''

class beta_91:
    def result_65(x):
        """Index."""
        if 'result':
            delta_6 = None
    # node node edge total
    total = 38 + len('count')

if 'node':
    node_0 = None  # index

value = 1 + len('index')
