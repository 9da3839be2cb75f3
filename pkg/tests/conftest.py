"""Pytest configuration and fixtures."""
import pytest
from flask import Flask

from api import register_blueprints
from commands import hsm_cli
from db import db
from distributions import DistributionSpec, Orientation
from hsmodel import HierarchySpec, build_instance
from services.sweep_service import SweepCell


def pytest_addoption(parser):
    parser.addoption(
        '--run-acceptance', action='store_true', default=False,
        help='Run the long experiment replication tests'
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption('--run-acceptance'):
        return
    skip = pytest.mark.skip(reason='needs --run-acceptance')
    for item in items:
        if 'acceptance' in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope='function')
def app():
    """Create Flask app for testing."""
    app = Flask(__name__)
    app.config['TESTING'] = True
    app.config['SQLALCHEMY_DATABASE_URI'] = 'sqlite:///:memory:'
    app.config['SQLALCHEMY_TRACK_MODIFICATIONS'] = False
    app.config['HSM_MASTER_SEED'] = 20130526
    app.config['HSM_API_MAX_CELLS'] = 50
    app.config['HSM_TWO_TERM_GRID'] = (0.1, 5.0, 0.01)
    app.config['HSM_SWEEP_WORKERS'] = 1
    app.config['HSM_NT_THRESHOLD'] = 1

    db.init_app(app)
    register_blueprints(app)
    app.cli.add_command(hsm_cli)

    with app.app_context():
        db.create_all()
        yield app
        db.drop_all()


@pytest.fixture(scope='function')
def client(app):
    return app.test_client()


@pytest.fixture(scope='function')
def db_session(app):
    """Database session for testing."""
    with app.app_context():
        yield db.session


@pytest.fixture
def small_instance():
    """N=60 objects in 3 hierarchies of 10, 20 and 30 objects."""
    spec = HierarchySpec(
        n_objects=60,
        n_hierarchies=3,
        fm=DistributionSpec.triangular(3, Orientation.ASCENDING),
        fw=DistributionSpec.power(1.0),
        fc=DistributionSpec.triangular(4),
    )
    return build_instance(spec)


def _make_cell(cell_id, alpha, adj_r2, m=5, n=1000, fm=2.0, fw=1.0, fc=2.0, replicate=0):
    return SweepCell(
        cell_id=cell_id,
        m=m,
        n=n,
        draws=1000,
        fm=DistributionSpec.triangular(fm, Orientation.ASCENDING),
        fw=DistributionSpec.triangular(fw),
        fc=DistributionSpec.triangular(fc),
        replicate=replicate,
        seed=cell_id + 1,
        alpha=alpha,
        adj_r2=adj_r2,
        n_zero=0,
    )


@pytest.fixture
def make_cell():
    """Factory for finished sweep cells with triangular levels."""
    return _make_cell
