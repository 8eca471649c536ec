class P:
    """Point."""
    x: int = 0  # x
    y: int = 0

    def norm(self):
        "Norm."
        return (self.x ** 2 + self.y ** 2) ** 0.5
