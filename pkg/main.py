from contextlib import asynccontextmanager
from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from app.config import settings
from app.api.v1.discourses import discourse_router
from app.api.v1.rules import rule_router
from app.utilities.logger import logger

from scalar_fastapi import get_scalar_api_reference

description = """
Complementary Preference Resolver resolves third-person pronouns in annotated
discourses and explains every choice it makes.

### Key Features

- **Unstressed pronouns**
  - Candidates come from the local attentional state, filtered by agreement
  - Commonsense (WK), attentional (ATT) and parallelism (LF) preferences
    combined under the override lattice SYN+SEM > WK > ATT > LF
  - Garden-path and weak-preference markers

- **Stressed pronouns**
  - Complementary preference: the unstressed order, every pair reversed
  - Focus constraints discharged by derivable contrast, a contrasting local
    entity, or an accommodated question

- **Discourse documents**
  - Line-oriented format with entities, utterances, stressed variants,
    inline rules and expectations
  - Deterministic reports with full derivation traces

---

**Typical Workflow:**
1. POST a document to `/api/v1/discourses/resolve`.
2. Read each pronoun's value, felicity and discharge from the report.
3. POST the same document to `/api/v1/discourses/asymmetry` to compare
   stressed and unstressed counterparts.
"""


@asynccontextmanager
async def lifespan(app: FastAPI):
    # Startup
    logger.info(f"{settings.PROJECT_NAME} starting ({settings.ENVIRONMENT})")
    yield
    # Shutdown


app = FastAPI(
    title=settings.PROJECT_NAME,
    description=description,
    version=settings.API_VERSION,
    openapi_url=f"{settings.API_V1_STR}/openapi.json",
    docs_url="/docs",
    redoc_url="/redoc",
    lifespan=lifespan,
)

if settings.BACKEND_CORS_ORIGINS:
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[str(origin) for origin in settings.BACKEND_CORS_ORIGINS],
        allow_credentials=True,
        allow_methods=["*"],
        allow_headers=["*"],
    )


@app.get("/scalar", include_in_schema=False)
async def scalar_html():
    return get_scalar_api_reference(
        openapi_url=app.openapi_url,
        title=app.title,
        show_sidebar=True,
        hide_download_button=True,
        hide_models=True,
        dark_mode=True,
        servers=[
            {"url": "http://localhost:8000"},
            {"url": "http://127.0.0.1:8000"},
        ],
        default_open_all_tags=True,
    )


app.include_router(
    discourse_router.router,
    prefix=f"{settings.API_V1_STR}/discourses",
    tags=["discourses"],
)

app.include_router(
    rule_router.router,
    prefix=f"{settings.API_V1_STR}/rules",
    tags=["rules"],
)


@app.get("/health", tags=["health"])
async def health_check():
    return {"status": "healthy"}
