values = [
    1,  # one
    # standalone
    2,
]
