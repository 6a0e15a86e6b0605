from src.cli import cli


def main():
    """
    Entry point: python -m src.main <command> [options]
    """
    cli()


if __name__ == "__main__":
    main()
