import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from app.database import create_db_and_tables
from app.services.catalog import catalog_handles
from app.utils.settings import settings

#routers
from app.routers import catalog, spec, runs

logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")


@asynccontextmanager
async def lifespan(app: FastAPI):
    print("\n========== 🚀 Server Startup Process ==========", flush=True)

    # 1. run archive tables
    print("🛠️  [Database] Checking & Creating Tables...", flush=True)
    create_db_and_tables()
    print("✅ [Database] Ready.", flush=True)

    # 2. catalog families
    handles = catalog_handles()
    print(f"📚 [Catalog] {len(handles)} families loaded: {', '.join(h.family_id for h in handles)}", flush=True)
    print(f"⚙️  [Config] budget={settings.budget} ideal_cap={settings.ideal_cap}", flush=True)

    print("===============================================\n", flush=True)
    yield
    print("\n👋 Server Shutting Down...", flush=True)


app = FastAPI(
    title="PreCu Toolkit",
    description="Exact checks for PreCu, C and Cu ordered monoids",
    version="1.0.0",
    lifespan=lifespan
)

origins = [
    "http://localhost:3000",
    "http://127.0.0.1:3000",
    "*"
]

app.add_middleware(
    CORSMiddleware,
    allow_origins=origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

#routers
app.include_router(catalog.router, prefix="/api")
app.include_router(spec.router, prefix="/api")
app.include_router(runs.router, prefix="/api")


@app.get("/")
def read_root():
    return {
        "message": "PreCu Toolkit API Server is Running!",
        "system": "FastAPI + SQLModel",
        "status": "Healthy"
    }
