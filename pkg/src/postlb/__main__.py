# SPDX-License-Identifier: Apache-2.0
"""Allow running as python -m postlb"""

from postlb.main import main

if __name__ == "__main__":
    main()
