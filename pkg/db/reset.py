"""
Reset the result store: drop every table and recreate the current schema.
WARNING: This deletes all stored sweep runs!
"""
import logging
import os

from db.models import db

logger = logging.getLogger(__name__)


def reset_database() -> None:
    """Drop and recreate all tables. Needs an application context."""
    env = os.environ.get('FLASK_ENV', 'development').lower()
    if env == 'production':
        raise RuntimeError("Refusing to reset the database in production")

    logger.info(f"Dropping existing tables (environment: {env})...")
    db.drop_all()
    db.create_all()
    logger.info("Database reset complete: sweep_runs and sweep_cells recreated")


if __name__ == "__main__":
    from app import app

    response = input("This will delete all stored sweep runs. Continue? (yes/no): ")
    if response.lower() == 'yes':
        with app.app_context():
            reset_database()
    else:
        print("Cancelled.")
