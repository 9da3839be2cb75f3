"""Main Flask application."""
import os
import logging
from flask import Flask
from flask_cors import CORS
from db import db
from config import create_app_config
from api import register_blueprints
from commands import hsm_cli

app = Flask(__name__)

# Configure the application
create_app_config(app)

# Configure logging
logging.basicConfig(
    level=app.config['HSM_LOG_LEVEL'],
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

# Set CORS_ORIGINS env var (comma-separated) to restrict origins
cors_origins = os.environ.get('CORS_ORIGINS')
if cors_origins:
    CORS(app, origins=[origin.strip() for origin in cors_origins.split(',')])
else:
    CORS(app)

# Initialize database
db.init_app(app)

with app.app_context():
    db.create_all()

# Register routes and the `flask hsm` command group
register_blueprints(app)
app.cli.add_command(hsm_cli)

if __name__ == '__main__':
    app.run(debug=True, port=5000)
