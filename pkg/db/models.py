"""Database models for stored sweep runs."""
from flask_sqlalchemy import SQLAlchemy
from datetime import datetime
import enum

db = SQLAlchemy()


class RunStatus(enum.Enum):
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


class SweepRun(db.Model):
    __tablename__ = 'sweep_runs'

    id = db.Column(db.Integer, primary_key=True)
    name = db.Column(db.String(120), nullable=False, index=True)
    preset = db.Column(db.String(40), nullable=True, index=True)
    mode = db.Column(db.String(20), nullable=False)
    # 64-bit unsigned seeds do not fit a signed SQL integer.
    master_seed = db.Column(db.String(20), nullable=False)
    config_json = db.Column(db.JSON, nullable=False)
    status = db.Column(db.Enum(RunStatus), nullable=False, default=RunStatus.RUNNING, index=True)
    n_cells = db.Column(db.Integer, nullable=False, default=0)
    n_failed = db.Column(db.Integer, nullable=False, default=0)
    summary_json = db.Column(db.JSON, nullable=True)
    created_at = db.Column(db.DateTime, default=datetime.utcnow, nullable=False)
    finished_at = db.Column(db.DateTime, nullable=True)

    # Relationships
    cells = db.relationship('SweepCellRecord', backref='run', lazy=True,
                            order_by='SweepCellRecord.cell_id', cascade='all, delete-orphan')

    def __repr__(self):
        return f'<SweepRun {self.id} {self.name} ({self.status.value})>'

    def to_dict(self):
        return {
            'id': self.id,
            'name': self.name,
            'preset': self.preset,
            'mode': self.mode,
            'master_seed': self.master_seed,
            'config': self.config_json,
            'status': self.status.value,
            'n_cells': self.n_cells,
            'n_failed': self.n_failed,
            'summary': self.summary_json,
            'created_at': self.created_at.isoformat() if self.created_at else None,
            'finished_at': self.finished_at.isoformat() if self.finished_at else None,
        }


class SweepCellRecord(db.Model):
    __tablename__ = 'sweep_cells'

    id = db.Column(db.Integer, primary_key=True)
    run_id = db.Column(db.Integer, db.ForeignKey('sweep_runs.id'), nullable=False, index=True)
    cell_id = db.Column(db.Integer, nullable=False)
    m = db.Column(db.Integer, nullable=False)
    n = db.Column(db.Integer, nullable=False)
    draws = db.Column(db.BigInteger, nullable=False)
    fm = db.Column(db.String(200), nullable=False)
    fw = db.Column(db.String(200), nullable=False)
    fc = db.Column(db.String(200), nullable=False)
    replicate = db.Column(db.Integer, nullable=False)
    seed = db.Column(db.String(20), nullable=False)
    alpha = db.Column(db.Float, nullable=True)
    adj_r2 = db.Column(db.Float, nullable=True)
    r2 = db.Column(db.Float, nullable=True)
    log_intercept = db.Column(db.Float, nullable=True)
    n_points = db.Column(db.Integer, nullable=True)
    n_zero = db.Column(db.Integer, nullable=True)
    error = db.Column(db.Text, nullable=True)

    __table_args__ = (db.UniqueConstraint('run_id', 'cell_id', name='uq_run_cell'),)

    def __repr__(self):
        return f'<SweepCellRecord run={self.run_id} cell={self.cell_id} alpha={self.alpha}>'
