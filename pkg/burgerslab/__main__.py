"""
burgerslab - run the command line front end
"""
from burgerslab.cli.main import entrypoint

if __name__ == "__main__":
    entrypoint()
