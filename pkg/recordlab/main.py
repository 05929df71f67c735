import logging

# Load environment variables from .env file before the settings are read
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass
except Exception as e:
    logging.getLogger(__name__).warning(f"Error loading .env file: {e}")

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from . import __version__
from .config import settings
from .models.requests import ServiceInfo
from .routers import asymptotic, constants, exact, records, simulation

logging.basicConfig(level=settings.LOG_LEVEL)
logger = logging.getLogger(__name__)

if not settings.validate():
    logger.warning("Configuration has warnings; continuing with the values above")

app = FastAPI(
    title="RecordLab",
    description="Exact laws, asymptotics, variance constants and simulation of multivariate records",
    version=__version__
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_methods=["GET", "POST", "OPTIONS"],
    allow_headers=["*"],
)

for module in (records, exact, asymptotic, constants, simulation):
    try:
        app.include_router(module.router)
        logger.info(f"{module.__name__.rsplit('.', 1)[-1]} router loaded ({len(module.router.routes)} routes)")
    except Exception as e:
        logger.error(f"Failed to load {module.__name__}: {e}")
        raise


@app.get("/", response_model=ServiceInfo)
async def root():
    return ServiceInfo(message="RecordLab API", version=__version__)
