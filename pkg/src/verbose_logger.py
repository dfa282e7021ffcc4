"""
Verbose Logger Module for Teledistill
Provides functionality to log verification checks, guard refusals and other debug information
"""

import logging
import os
from datetime import datetime
from pathlib import Path
from typing import Optional


class VerboseLogger:
    """Logger class to handle verbose output and file logging"""

    def __init__(self, verbose: bool = False, log_file: Optional[str] = None,
                 log_dir: Optional[str] = None, level: str = "DEBUG"):
        """Initialize the logger

        Args:
            verbose: Whether to print log records to the console
            log_file: Path to log file. If None and log_dir is set, creates a
                timestamped file in log_dir; if both are None, no file is written
            log_dir: Directory for timestamped log files
            level: Logging level name for the handlers
        """
        if not log_file and log_dir:
            Path(log_dir).mkdir(parents=True, exist_ok=True)
            timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
            log_file = os.path.join(log_dir, f"teledistill_{timestamp}.log")

        self.logger = logging.getLogger('teledistill')
        self.logger.setLevel(getattr(logging, str(level).upper(), logging.DEBUG))

        # Clear any existing handlers
        if self.logger.handlers:
            self.logger.handlers.clear()

        if log_file:
            file_handler = logging.FileHandler(log_file)
            file_handler.setFormatter(logging.Formatter(
                '%(asctime)s - %(levelname)s - %(name)s - %(message)s'
            ))
            self.logger.addHandler(file_handler)

        self.verbose = verbose
        if verbose:
            console_handler = logging.StreamHandler()
            console_handler.setFormatter(logging.Formatter(
                '\033[92m%(asctime)s\033[0m - \033[94m%(levelname)s\033[0m - %(message)s'
            ))
            self.logger.addHandler(console_handler)

        if not self.logger.handlers:
            self.logger.addHandler(logging.NullHandler())

        self.log_file = log_file
        self.logger.info(f"Logging initialized. Log file: {log_file}")

    def log_check(self, name: str, gap: float, tol: float, passed: bool):
        """Log the outcome of a numerical check

        Args:
            name: Check name (e.g. "lemma1 d=2 n=1")
            gap: Observed gap
            tol: Tolerance the gap is compared against
            passed: Whether the check passed
        """
        status = "PASS" if passed else "FAIL"
        msg = f"CHECK {status}: {name} gap={gap:.3e} tol={tol:.1e}"
        if passed:
            self.logger.info(msg)
        else:
            self.logger.warning(msg)

    def log_guard(self, name: str, size: int, limit: int):
        """Log a refused enumeration"""
        self.logger.warning(f"GUARD: {name} size {size} exceeds limit {limit}")

    def log_error(self, error, context=None, include_traceback=False):
        """Log an error with optional traceback

        Args:
            error: The error that occurred
            context (str, optional): Additional context about the error
            include_traceback (bool): If True, include full traceback in log file
        """
        import traceback as tb
        context_info = f" - Context: {context}" if context else ""
        self.logger.error(f"ERROR: {str(error)}{context_info}")
        if include_traceback:
            self.logger.error(f"Traceback:\n{tb.format_exc()}")

    def log_info(self, message):
        self.logger.info(message)

    def log_warning(self, message):
        self.logger.warning(message)

    def log_debug(self, message):
        self.logger.debug(message)

    def get_log_file_path(self):
        """Get the path to the current log file

        Returns:
            str: Path to the log file, or None when logging only to the console
        """
        return self.log_file


# Global logger instance - will be initialized by main application
logger = None


def init_logger(verbose=False, log_file=None, log_dir=None, level="DEBUG"):
    """Initialize the global logger instance

    Args:
        verbose (bool): Whether to enable verbose mode
        log_file (str, optional): Path to log file
        log_dir (str, optional): Directory for a timestamped log file
        level (str): Logging level name

    Returns:
        VerboseLogger: The logger instance
    """
    global logger
    logger = VerboseLogger(verbose=verbose, log_file=log_file, log_dir=log_dir, level=level)
    return logger


def get_logger():
    """Get the global logger instance

    Returns:
        VerboseLogger: The logger instance
    """
    global logger
    if logger is None:
        logger = init_logger()
    return logger
