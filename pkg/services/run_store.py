"""Run store: persists sweep runs and their cells through Flask-SQLAlchemy."""
import logging
from datetime import datetime
from typing import List, Optional, Sequence

from sqlalchemy.exc import IntegrityError

from db import db, RunStatus, SweepRun, SweepCellRecord
from distributions import format_spec, parse_spec
from services.sweep_service import SweepCell, SweepConfig

logger = logging.getLogger(__name__)


class RunNotFoundError(ValueError):
    """Raised when a stored run id does not exist."""
    pass


def _record(run_id: int, cell: SweepCell) -> SweepCellRecord:
    fit = cell.fit
    return SweepCellRecord(
        run_id=run_id,
        cell_id=cell.cell_id,
        m=cell.m,
        n=cell.n,
        draws=cell.draws,
        fm=format_spec(cell.fm),
        fw=format_spec(cell.fw),
        fc=format_spec(cell.fc),
        replicate=cell.replicate,
        seed=str(cell.seed),
        alpha=cell.alpha,
        adj_r2=cell.adj_r2,
        r2=fit.r2 if fit else None,
        log_intercept=fit.log_intercept if fit else None,
        n_points=fit.n_points if fit else None,
        n_zero=cell.n_zero,
        error=cell.error,
    )


def _cell(record: SweepCellRecord) -> SweepCell:
    return SweepCell(
        cell_id=record.cell_id,
        m=record.m,
        n=record.n,
        draws=record.draws,
        fm=parse_spec(record.fm),
        fw=parse_spec(record.fw),
        fc=parse_spec(record.fc),
        replicate=record.replicate,
        seed=int(record.seed),
        alpha=record.alpha,
        adj_r2=record.adj_r2,
        n_zero=record.n_zero,
        error=record.error,
    )


class RunStore:
    """Service for saving and loading sweep runs."""

    @staticmethod
    def start_run(config: SweepConfig, preset: Optional[str] = None) -> SweepRun:
        """Create a run row in RUNNING state before the cells are computed."""
        run = SweepRun(
            name=config.name,
            preset=preset,
            mode=config.mode.value,
            master_seed=str(config.master_seed),
            config_json=config.to_dict(),
            status=RunStatus.RUNNING,
        )
        db.session.add(run)
        db.session.commit()
        return run

    @staticmethod
    def finish_run(run_id: int, cells: Sequence[SweepCell], summary: Optional[dict] = None) -> SweepRun:
        """
        Store the cells of a run and mark it completed.

        Raises:
            RunNotFoundError: Unknown run id
            ValueError: If the cells clash with cells already stored for the run
        """
        run = RunStore.get_run(run_id)
        try:
            for cell in cells:
                db.session.add(_record(run.id, cell))
            run.n_cells = len(cells)
            run.n_failed = sum(1 for c in cells if not c.ok)
            run.summary_json = summary
            run.status = RunStatus.COMPLETED
            run.finished_at = datetime.utcnow()
            db.session.commit()
        except IntegrityError as e:
            db.session.rollback()
            raise ValueError(f"Database integrity error: {str(e)}")
        logger.info(f"Stored run {run.id} ({run.n_cells} cells, {run.n_failed} failed)")
        return run

    @staticmethod
    def fail_run(run_id: int, message: str) -> None:
        run = RunStore.get_run(run_id)
        run.status = RunStatus.FAILED
        run.summary_json = {'error': message}
        run.finished_at = datetime.utcnow()
        db.session.commit()

    @staticmethod
    def save_run(config: SweepConfig, cells: Sequence[SweepCell], preset: Optional[str] = None,
                 summary: Optional[dict] = None) -> SweepRun:
        run = RunStore.start_run(config, preset)
        return RunStore.finish_run(run.id, cells, summary)

    @staticmethod
    def get_run(run_id: int) -> SweepRun:
        run = db.session.get(SweepRun, run_id)
        if not run:
            raise RunNotFoundError(f"Sweep run {run_id} not found")
        return run

    @staticmethod
    def list_runs(limit: int = 50) -> List[SweepRun]:
        return SweepRun.query.order_by(SweepRun.created_at.desc(), SweepRun.id.desc()).limit(limit).all()

    @staticmethod
    def load_cells(run_id: int) -> List[SweepCell]:
        """Cells of a stored run as SweepCell objects, ordered by cell_id."""
        run = RunStore.get_run(run_id)
        return [_cell(record) for record in run.cells]
