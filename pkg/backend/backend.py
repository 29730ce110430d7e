import logging
from typing import Optional

from fastapi import Body, FastAPI, HTTPException, Query, status
from fastapi.middleware.cors import CORSMiddleware

# Local imports
from idexp.errors import InputError
from idexp.logs import setup_logging
from idexp.problemService import ProblemService, is_honest_failure

'''
HTTP API over the idexp problem service


1. FastAPI app handles HTTP requests and responses.
2. ProblemService validates problem documents and runs one command per request.
3. Responses are JSON reports, the same ones the command line prints.
    * unknown command -> 404, bad input -> 400, exhausted search or unsupported characteristic -> 422
'''

# app
app = FastAPI(title="idexp")

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_methods=["GET", "POST", "OPTIONS"],
    allow_headers=["*"],
)

logger = setup_logging().getChild("backend")

problem_service = ProblemService()


# Routes
@app.get("/")
async def root():
    return {"message": "idexp is running", "commands": len(problem_service.commands)}


@app.get("/commands")
async def list_commands():
    return problem_service.list_commands()


@app.get("/fixtures")
async def list_fixtures():
    return problem_service.list_fixtures()


@app.get("/fixtures/{name}")
async def get_fixture(name: str):
    result = problem_service.get_fixture(name)
    if not result["success"]:
        raise HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail=result["message"])
    return result


# Run a command on a problem document; the body is a ProblemDocument in JSON
@app.post("/run/{command}")
def run_command(command: str, document: dict = Body(...),
                degree_bound: Optional[int] = Query(default=None, ge=1),
                search_depth: Optional[int] = Query(default=None, ge=0)):
    if command not in problem_service.commands:
        raise HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail=f"Unknown command '{command}'")
    report = problem_service.run(command, document, degree_bound=degree_bound, search_depth=search_depth)
    logger.info("POST /run/%s -> %s", command, "ok" if report["success"] else report["reason"])
    if report["success"]:
        return report
    if is_honest_failure(report):
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=report)
    if report["reason"] in (InputError.reason, "precondition"):
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=report)
    raise HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=report)
