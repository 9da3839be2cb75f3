"""Application configuration."""
import logging
import os
from typing import Optional

import numpy as np
from flask import Flask
from dotenv import load_dotenv

from fitkit import exponent_grid

# Load environment variables from .env file (for local dev)
load_dotenv()

DEFAULT_MASTER_SEED = 20130526
DEFAULT_TWO_TERM_GRID = '0.1:5:0.01'


def _parse_grid(text: str):
    try:
        lo, hi, step = (float(part) for part in text.split(':'))
    except ValueError:
        raise RuntimeError(f"HSM_TWO_TERM_GRID must look like lo:hi:step, got {text!r}")
    return lo, hi, step


def create_app_config(app: Flask) -> None:
    """Configure Flask application with all settings."""
    # Environment
    env = os.environ.get('FLASK_ENV', 'development').lower()

    # Database configuration
    database_url = os.environ.get('HSM_DATABASE_URL')
    if env == 'production':
        if not database_url:
            raise RuntimeError("HSM_DATABASE_URL must be set in production")
        app.config['SQLALCHEMY_DATABASE_URI'] = database_url
    else:
        basedir = os.path.abspath(os.path.dirname(__file__))
        app.config['SQLALCHEMY_DATABASE_URI'] = (
            database_url or f'sqlite:///{os.path.join(basedir, "hsm.db")}'
        )

    app.config['SQLALCHEMY_TRACK_MODIFICATIONS'] = False

    # Experiment defaults
    app.config['HSM_OUTPUT_DIR'] = os.environ.get('HSM_OUTPUT_DIR', 'results')
    app.config['HSM_MASTER_SEED'] = int(os.environ.get('HSM_MASTER_SEED', str(DEFAULT_MASTER_SEED)))
    app.config['HSM_SWEEP_WORKERS'] = int(os.environ.get('HSM_SWEEP_WORKERS', '1'))
    app.config['HSM_API_MAX_CELLS'] = int(os.environ.get('HSM_API_MAX_CELLS', '400'))
    app.config['HSM_NT_THRESHOLD'] = int(os.environ.get('HSM_NT_THRESHOLD', '1'))
    app.config['HSM_TWO_TERM_GRID'] = _parse_grid(
        os.environ.get('HSM_TWO_TERM_GRID', DEFAULT_TWO_TERM_GRID)
    )

    # Logging level (root logger is configured in app.py)
    level_name = os.environ.get('HSM_LOG_LEVEL', 'INFO').upper()
    app.config['HSM_LOG_LEVEL'] = getattr(logging, level_name, logging.INFO)


def get_output_dir(app: Flask, override: Optional[str] = None) -> str:
    """Directory for result files; a CLI ``--out`` override wins."""
    return override or app.config.get('HSM_OUTPUT_DIR', 'results')


def get_two_term_grid(app: Flask) -> np.ndarray:
    """Exponent grid for both axes of the two-term fit."""
    lo, hi, step = app.config.get('HSM_TWO_TERM_GRID', _parse_grid(DEFAULT_TWO_TERM_GRID))
    return exponent_grid(lo, hi, step)
