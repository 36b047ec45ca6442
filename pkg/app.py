import logging
from flask import Flask
from werkzeug.middleware.proxy_fix import ProxyFix

from utils.settings import get_setting

# Configure logging
logging.basicConfig(
    level=str(get_setting("logging", "level", "WARNING")).upper(),
    format="%(asctime)s %(levelname)s %(name)s: %(message)s",
)

# Create the app
app = Flask(__name__)
app.wsgi_app = ProxyFix(app.wsgi_app, x_proto=1, x_host=1)
app.json.sort_keys = False
