"""Database models and initialization."""
from .models import db, RunStatus, SweepRun, SweepCellRecord

__all__ = ['db', 'RunStatus', 'SweepRun', 'SweepCellRecord']
