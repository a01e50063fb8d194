import logging
import os
from typing import Optional

def setup_logging(log_file: Optional[str] = None, name: str = 'LBBOOST',
                  level: int = logging.INFO) -> logging.Logger:

    logger = logging.getLogger(name)
    logger.setLevel(level)

    formatter = logging.Formatter('%(asctime)s - %(name)s - %(message)s')

    # calling this twice (e.g. train then detect in the same session) must not duplicate lines
    has_console = any(type(h) is logging.StreamHandler for h in logger.handlers)
    if not has_console:
        console_handler = logging.StreamHandler()
        console_handler.setLevel(level)
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

    if log_file is not None:
        log_file = os.path.abspath(log_file)
        has_file = any(isinstance(h, logging.FileHandler) and h.baseFilename == log_file
                       for h in logger.handlers)
        if not has_file:
            os.makedirs(os.path.dirname(log_file), exist_ok = True)
            file_handler = logging.FileHandler(log_file)
            file_handler.setLevel(level)
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)

    return logger
