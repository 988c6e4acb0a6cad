import logging
import sys

from rich.console import Console
from rich.logging import RichHandler

DEFAULT_FORMAT = "%(asctime)s %(name)-36s %(levelname)-8s %(message)s"


def setup_logging(level: str = "INFO", fmt: str | None = None, rich: bool = False) -> None:
    """Configure the root logger. Call once at application startup.

    With ``rich`` the records go through a RichHandler on stderr, which
    renders its own time and level columns, so only the message part of
    ``fmt`` is kept.
    """
    resolved = getattr(logging, level.upper(), logging.INFO)
    if rich:
        handler = RichHandler(console=Console(stderr=True), show_path=False, rich_tracebacks=True)
        logging.basicConfig(level=resolved, format="%(message)s", handlers=[handler], force=True)
        return
    logging.basicConfig(level=resolved, format=fmt or DEFAULT_FORMAT, stream=sys.stderr, force=True)


def get_logger(name: str) -> logging.Logger:
    """Return a named logger. Modules can also use logging.getLogger(__name__) directly."""
    return logging.getLogger(name)
