import logging
import sys

from colorama import init, Fore, Style

# Initialize colorama for colorful console output.
init()

LEVEL_COLORS = {
    logging.DEBUG: Fore.BLUE,
    logging.INFO: Fore.CYAN,
    logging.WARNING: Fore.YELLOW,
    logging.ERROR: Fore.RED,
    logging.CRITICAL: Fore.RED + Style.BRIGHT,
}


class ColoredFormatter(logging.Formatter):
    """Formats records as `LEVEL name: message` with a colored level name."""

    def __init__(self, use_color=True):
        super().__init__("%(levelname)s %(name)s: %(message)s")
        self.use_color = use_color

    def format(self, record):
        text = super().format(record)
        if not self.use_color:
            return text
        color = LEVEL_COLORS.get(record.levelno, "")
        return text.replace(record.levelname, color + record.levelname + Style.RESET_ALL, 1)


def get_logger(name):
    return logging.getLogger(name)


def configure_logging(verbose=False, stream=None):
    """Installs one colored stderr handler on the package logger."""
    logger = logging.getLogger("mmp_hypergraph")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setFormatter(ColoredFormatter(use_color=(stream is None)))
    logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)
    logger.propagate = False
    return logger


def print_frame(text):
    """Prints a framed text box with colored borders."""
    width = max(len(line) for line in text.split('\n')) + 4
    print(Fore.CYAN + "+" + "-" * (width - 2) + "+")
    for line in text.split('\n'):
        print(Fore.CYAN + "| " + Fore.WHITE + line.ljust(width - 4) + Fore.CYAN + " |")
    print(Fore.CYAN + "+" + "-" * (width - 2) + "+" + Style.RESET_ALL)


def success(text):
    print(Fore.GREEN + text + Style.RESET_ALL)


def warning(text):
    print(Fore.YELLOW + text + Style.RESET_ALL)


def error(text):
    print(Fore.RED + text + Style.RESET_ALL, file=sys.stderr)
