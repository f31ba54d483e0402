"""
Utility helpers
Logging setup, console status lines and progress bars
"""

import logging
import sys
from pathlib import Path
from typing import Iterable, Iterator, Optional, TypeVar

from colorama import Fore, Style
from colorama import init as colorama_init
from tqdm import tqdm

T = TypeVar("T")

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"

_logging_configured = False


def find_project_root() -> Path:
    """Directory holding kisinlab_config.json / pyproject.toml, else the cwd"""
    here = Path(__file__).resolve().parent.parent
    for candidate in (here, *here.parents):
        if (candidate / "pyproject.toml").exists():
            return candidate
    return Path.cwd()


def setup_logging(level: str = "INFO", log_file: Optional[str] = None) -> None:
    """Configure the root logger once: stderr plus an optional UTF-8 log file"""
    global _logging_configured
    handlers: list = [logging.StreamHandler(sys.stderr)]
    if log_file:
        path = Path(log_file)
        path.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(path, encoding="utf-8"))

    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format=LOG_FORMAT,
        handlers=handlers,
        force=_logging_configured,
    )
    _logging_configured = True
    colorama_init()


def print_progress(message: str, progress: int = 0) -> None:
    """Status line with an optional 20-cell bar"""
    if progress > 0:
        bar = "█" * (progress // 5) + "░" * (20 - progress // 5)
        print(f"\r{message} [{bar}] {progress}%", end="", flush=True, file=sys.stderr)
    else:
        print(f"⏳ {message}", file=sys.stderr)


def print_status(ok: bool, message: str) -> None:
    """Green tick or red cross in front of a message"""
    if ok:
        print(f"{Fore.GREEN}✅ {message}{Style.RESET_ALL}")
    else:
        print(f"{Fore.RED}❌ {message}{Style.RESET_ALL}")


def print_warning(message: str) -> None:
    print(f"{Fore.YELLOW}⚠️  {message}{Style.RESET_ALL}", file=sys.stderr)


def progress_iter(iterable: Iterable[T], desc: str, total: Optional[int] = None,
                  enabled: bool = True) -> Iterator[T]:
    """tqdm wrapper with the settings used for census loops"""
    return iter(tqdm(
        iterable,
        desc=desc,
        total=total,
        disable=not enabled,
        dynamic_ncols=True,
        smoothing=0.0,
        ascii=True,
        miniters=0,
        leave=False,
    ))
