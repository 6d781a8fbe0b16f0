# coding: utf-8
from anisoemit.cli import main

if __name__ == "__main__":
    main()
