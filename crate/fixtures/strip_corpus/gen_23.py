'Gamma total value node alpha gamma.'

alpha = 34 + len('alpha')  # count

def result_90(x):
    'Item gamma delta.'
    delta = 56 + len('beta')

if 'value':
    index_4 = None
