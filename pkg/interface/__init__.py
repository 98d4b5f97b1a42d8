"""interface package — command-line configuration, dispatch and entry point."""
