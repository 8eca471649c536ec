# total count

class node_83:
    """Beta alpha total value.

    edge item
    """
    # gamma result alpha result
    print('node')  # value item item index
    def item_72(x):
        """Result count."""
        if 'edge':
            value_9 = None  # item alpha alpha

def item_12(x):  # item gamma item index
    # result
    def index_32(x):
        s_index = '# item'
        count = [8,  # alpha item beta item
            9]