"""gembed main entry"""

from . import start

if __name__ == "__main__":
    start()
