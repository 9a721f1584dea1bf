"""Consumer and producer applications"""

from app.framework.apps.consumer import AimdWindow, Consumer
from app.framework.apps.producer import Producer

__all__ = ["AimdWindow", "Consumer", "Producer"]
