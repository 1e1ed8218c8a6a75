"""End-to-end tour over the HTTP wire (in-process client, same payloads a
browser would send)."""

from fastapi.testclient import TestClient

from cophub import Engine
from cophub.api import ServiceConfig, build_app
from cophub.fixtures import TUTOR1_EMAIL, TUTOR2_EMAIL, build_fig3

engine = Engine()
handles = build_fig3(engine)
client = TestClient(build_app(engine, ServiceConfig(admin_token="demo-admin")))


def login(email):
    token = client.post("/api/sessions", json={"email": email}).json()["token"]
    return {"Authorization": f"Bearer {token}"}


t1 = login(TUTOR1_EMAIL)
t2 = login(TUTOR2_EMAIL)

roots = client.get("/api/taxonomy/roots", headers=t1).json()
print(f"GET /api/taxonomy/roots -> {[s['label'] for s in roots['subjects']]}")

view = client.get("/api/taxonomy/view", params={"scope": "working_context"}, headers=t1).json()
print(f"GET /api/taxonomy/view (Tutor 1, working) -> {len(view['subjects'])} subjects")

created = client.post(
    "/api/discussions",
    json={
        "title": "Office hours that students attend",
        "body": "What time slots actually work?",
        "subjects": [handles.subjects["courses"]],
    },
    headers=t2,
)
print(f"POST /api/discussions -> {created.status_code}, id {created.json()['id']}")

search = client.post(
    "/api/search/resources",
    json={"cart": [{"subject": handles.subjects["courses"], "active": True}], "scope": "all"},
    headers=t2,
)
print("POST /api/search/resources [courses] ->")
for hit in search.json()["hits"]:
    print(f"  - {hit['resource']['title']}")

forbidden = client.delete(
    f"/api/resources/{handles.discussion_collective}/subjects/{handles.subjects['courses']}",
    headers=t2,
)
print(f"Non-author removing a subject -> {forbidden.status_code} {forbidden.json()['code']}")

usage = client.get("/api/admin/usage", headers={"Authorization": "Bearer demo-admin"})
busiest = max(usage.json()["subjects"], key=lambda r: sum(r["usage"].values()))
print(f"GET /api/admin/usage -> busiest subject: {busiest['label']}")

print(f"OpenAPI description served at /api/spec "
      f"({len(client.get('/api/spec').json()['paths'])} paths)")
