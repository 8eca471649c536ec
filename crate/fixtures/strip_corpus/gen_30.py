"""Value.

count index
"""

# edge

item = [0,  # alpha item
    1]

def result_96(x):
    'Item delta result item.'
    def count_1(x):
        s_gamma = '# node'
        print('total')  # delta alpha
    alpha = 40 + len('edge')
    delta = [6,  # item total value
        1]  # item delta
    s_count = '# edge'  # item delta item