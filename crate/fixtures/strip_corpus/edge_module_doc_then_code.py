"""Module doc.

More lines.
"""

import os

x = os.sep
