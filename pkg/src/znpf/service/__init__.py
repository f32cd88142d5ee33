"""HTTP service layer: pydantic models, handlers and the FastAPI app."""
