"""
Archivo principal de la aplicación.

Este archivo configura la aplicación FastAPI del resolvedor de juegos obligantes.
"""

import uvicorn
from fastapi import FastAPI
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from api.endpoints.solve import router as solve_router
from config.default import REPORT_SCHEMA_VERSION, configure_logging

configure_logging()

# Crear la aplicación FastAPI
app = FastAPI(
    title="Oblige API",
    description="API para resolver juegos obligantes con objetivos Emerson-Lei",
    version="1.0.0"
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Incluir los routers de la API
app.include_router(solve_router, prefix="/api", tags=["juegos"])


# Manejo de errores personalizados
@app.exception_handler(RequestValidationError)
async def validation_exception_handler(request, exc):
    """Manejar errores de validación de solicitudes."""
    return JSONResponse(
        status_code=422,
        content={"status": "error", "detail": str(exc)},
    )


@app.get("/")
async def root():
    """Endpoint de prueba para verificar que la API está funcionando."""
    return {
        "status": "success",
        "message": "API de juegos obligantes funcionando correctamente",
        "version": "1.0.0",
        "schema_version": REPORT_SCHEMA_VERSION,
    }


# Punto de entrada para ejecutar con uvicorn directamente
if __name__ == "__main__":
    uvicorn.run("main:app", host="0.0.0.0", port=8000, reload=True)
