"""Lightweight bootstrapper for the walker console script.

Top-level code uses only the Python stdlib so the console entry point runs
even when the numeric stack is missing. Dependencies are installed into the
current environment, or into a private virtualenv when that fails, and the
command is then handed to `walker.cli`.
"""
from __future__ import annotations

import importlib
import os
import subprocess
import sys
import venv
from typing import List, Optional


RUNTIME_REQUIREMENTS: List[str] = [
    "typer>=0.9.0",
    "pydantic>=2.0.0",
    "pandas>=2.0.0",
    "mpmath>=1.3.0",
    "numpy>=1.22.0",
    "scipy>=1.9.0",
]

RUNTIME_MODULES = ("typer", "pydantic", "pandas", "mpmath", "numpy", "scipy")


def _python_in_venv(venv_dir: str) -> str:
    if os.name == "nt":
        return os.path.join(venv_dir, "Scripts", "python.exe")
    return os.path.join(venv_dir, "bin", "python")


def _install_packages(python_exe: str, packages: List[str]) -> None:
    cmd = [python_exe, "-m", "pip", "install", "--upgrade"] + packages
    subprocess.check_call(cmd)


def _create_venv_and_install(venv_dir: str) -> None:
    print(f"Creating walker virtual environment in {venv_dir}...")
    venv.create(venv_dir, with_pip=True)
    _install_packages(_python_in_venv(venv_dir), RUNTIME_REQUIREMENTS)
    print("[OK] Setup complete")


def _install_into_current_env() -> None:
    print("Installing walker dependencies into the current Python environment...")
    _install_packages(sys.executable, RUNTIME_REQUIREMENTS)
    print("[OK] Dependencies installed")


def _check_dependencies() -> bool:
    """Check if runtime dependencies are importable"""
    try:
        for name in RUNTIME_MODULES:
            importlib.import_module(name)
        return True
    except ImportError:
        return False


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point used by console_scripts."""
    argv = argv if argv is not None else sys.argv[1:]

    if _check_dependencies():
        from walker import cli
        return cli.run(argv)

    print("walker: first run, installing dependencies")
    try:
        _install_into_current_env()
        importlib.invalidate_caches()
        if _check_dependencies():
            from walker import cli
            return cli.run(argv)
        print("[WARN] Installation verification failed.")
    except subprocess.CalledProcessError:
        print("[WARN] Installation into the current environment failed; using a private virtualenv.")
        try:
            venv_dir = os.path.join(os.path.expanduser("~"), ".walker")
            _create_venv_and_install(venv_dir)
            py = _python_in_venv(venv_dir)
            return subprocess.call([py, "-m", "walker", *argv])
        except Exception as e:
            print(f"[ERROR] Setup failed: {e}")
            print("Manual installation:")
            print("     pip install " + " ".join(RUNTIME_MODULES))
            return 2
    return 1


if __name__ == "__main__":
    raise SystemExit(main())
