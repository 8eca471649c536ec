# alpha item beta alpha

# total node node beta

class item_75:
    """Alpha delta alpha item.

    delta count
    """

s_total = '# edge'

def value_13(x):
    beta = [5,  # total item value
        5]
    # delta beta index index  # total edge
