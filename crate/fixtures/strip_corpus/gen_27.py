"""Gamma total count total total.

delta index
"""

# index value delta

alpha = [1,  # delta
    8]  # gamma beta

result = 58 + len('total')
