"""Development server: python main.py, or uvicorn recordlab.main:app --reload"""
import os

import uvicorn

from recordlab.main import app

if __name__ == "__main__":
    uvicorn.run(app, host=os.getenv("RECORDLAB_HOST", "127.0.0.1"), port=int(os.getenv("RECORDLAB_PORT", "8000")))
