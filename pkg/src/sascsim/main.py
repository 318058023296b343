import sys

from sascsim.cli.app import run_cli


def main():
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
