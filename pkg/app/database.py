from sqlmodel import SQLModel, create_engine, Session

from app.utils.settings import settings

DATABASE_URL = settings.database_url

# sqlite needs the same-thread check off for the threadpool FastAPI runs sync routes in
connect_args = {"check_same_thread": False} if DATABASE_URL.startswith("sqlite") else {}
engine = create_engine(DATABASE_URL, echo=settings.sql_echo, connect_args=connect_args)

def get_db():
    with Session(engine) as session:
        yield session

def create_db_and_tables():
    SQLModel.metadata.create_all(engine)
