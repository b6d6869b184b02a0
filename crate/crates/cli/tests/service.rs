mod common;

use std::thread;

use common::Server;
use reqwest::blocking::Client;
use reqwest::StatusCode;
use serde_json::{json, Value};
use superbase_cli::session::{replay, GameSession};

fn create(client: &Client, server: &Server, tree: &str) -> Value {
    let resp = client
        .post(server.api("/hydra"))
        .json(&json!({ "tree": tree }))
        .send()
        .unwrap();
    assert_eq!(resp.status(), StatusCode::CREATED);
    resp.json().unwrap()
}

fn chop(client: &Client, server: &Server, id: &str, body: Value) -> (StatusCode, Value) {
    let resp = client
        .post(server.api(&format!("/hydra/{id}/chop")))
        .json(&body)
        .send()
        .unwrap();
    (resp.status(), resp.json().unwrap())
}

#[test]
fn two_heads_game() {
    let dir = tempfile::tempdir().unwrap();
    let server = Server::start(dir.path());
    let client = Client::new();

    let s = create(&client, &server, "(()())");
    assert_eq!(s["ordinal"], "2");
    assert_eq!(s["status"], "InProgress");
    assert_eq!(s["move_number"], 1);
    let id = s["id"].as_str().unwrap().to_string();
    assert_eq!(id.len(), 32);

    let (status, s) = chop(&client, &server, &id, json!({ "path": [0] }));
    assert_eq!(status, StatusCode::OK);
    assert_eq!(s["ordinal"], "1");
    let (status, s) = chop(&client, &server, &id, json!({ "path": [0] }));
    assert_eq!(status, StatusCode::OK);
    assert_eq!(s["ordinal"], "0");
    assert_eq!(s["status"], "Won");

    let (status, e) = chop(&client, &server, &id, json!({ "path": [0] }));
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(e["code"], "game_won");

    let h: Value = client
        .get(server.api(&format!("/hydra/{id}/history")))
        .send()
        .unwrap()
        .json()
        .unwrap();
    let ords: Vec<&str> = h["history"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["ordinal"].as_str().unwrap())
        .collect();
    assert_eq!(ords, ["1", "0"]);
}

#[test]
fn error_contract() {
    let dir = tempfile::tempdir().unwrap();
    let server = Server::start(dir.path());
    let client = Client::new();
    let s = create(&client, &server, "((())())");
    let id = s["id"].as_str().unwrap();
    assert_eq!(s["tree"], "(()(()))");

    let (status, e) = chop(&client, &server, id, json!({ "path": [1] }));
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(e["error"], "not a head");
    assert_eq!(e["code"], "not_a_head");

    let (status, e) = chop(&client, &server, id, json!({ "path": [7] }));
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(e["code"], "invalid_path");

    let (status, e) = chop(&client, &server, id, json!({ "path": "zero" }));
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(e["code"], "bad_request");

    let resp = client
        .post(server.api(&format!("/hydra/{id}/chop")))
        .body("{not json")
        .send()
        .unwrap();
    assert_eq!(resp.status(), StatusCode::BAD_REQUEST);
    let e: Value = resp.json().unwrap();
    assert_eq!(e["code"], "bad_request");

    let resp = client
        .post(server.api("/hydra"))
        .json(&json!({ "tree": "(()" }))
        .send()
        .unwrap();
    assert_eq!(resp.status(), StatusCode::BAD_REQUEST);

    let resp = client.get(server.api("/hydra/0123")).send().unwrap();
    assert_eq!(resp.status(), StatusCode::NOT_FOUND);
    let e: Value = resp.json().unwrap();
    assert_eq!(e["code"], "not_found");

    let (status, _) = chop(&client, &server, "nope", json!({ "path": [0] }));
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[test]
fn regrowth_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let server = Server::start(dir.path());
    let client = Client::new();
    let s = create(&client, &server, "((()()))");
    let id = s["id"].as_str().unwrap();
    assert_eq!(s["ordinal"], "w^2");

    // At move 1 the maimed parent gains one extra copy.
    let (_, s) = chop(&client, &server, id, json!({ "path": [0, 0], "move": 1 }));
    assert_eq!(s["tree"], "((())(()))");
    assert_eq!(s["ordinal"], "w*2");
    let (_, s) = chop(&client, &server, id, json!({ "path": [1, 0], "move": 2 }));
    assert_eq!(s["tree"], "(()()()(()))");
    assert_eq!(s["ordinal"], "w + 3");
    assert_eq!(s["node_count"], 6);
    assert_eq!(s["head_count"], 4);

    let session: GameSession = serde_json::from_value(s.clone()).unwrap();
    let hydra = replay(&session).unwrap();
    assert_eq!(hydra.to_string(), session.tree);
    assert_eq!(hydra.move_counter(), session.move_number);
}

#[test]
fn sessions_survive_restart() {
    let dir = tempfile::tempdir().unwrap();
    let client = Client::new();
    let server = Server::start(dir.path());
    let s = create(&client, &server, "(((()))())");
    let id = s["id"].as_str().unwrap().to_string();
    chop(&client, &server, &id, json!({ "path": [0] }));
    chop(&client, &server, &id, json!({ "path": [0, 0, 0] }));
    let before = client
        .get(server.api(&format!("/hydra/{id}")))
        .send()
        .unwrap()
        .text()
        .unwrap();
    server.kill();

    assert!(dir.path().join(format!("{id}.json")).exists());
    let server = Server::start(dir.path());
    let after = client
        .get(server.api(&format!("/hydra/{id}")))
        .send()
        .unwrap()
        .text()
        .unwrap();
    assert_eq!(before, after);

    let (status, s) = chop(&client, &server, &id, json!({ "path": [0, 0], "move": 3 }));
    assert_eq!(status, StatusCode::OK);
    assert_eq!(s["history"].as_array().unwrap().len(), 3);
}

#[test]
fn concurrent_chops_conflict() {
    let dir = tempfile::tempdir().unwrap();
    let server = Server::start(dir.path());
    let client = Client::new();
    for _ in 0..10 {
        let s = create(&client, &server, "(()()())");
        let id = s["id"].as_str().unwrap().to_string();
        let statuses: Vec<StatusCode> = thread::scope(|scope| {
            let handles: Vec<_> = [0, 1]
                .map(|i| {
                    let (client, server, id) = (&client, &server, &id);
                    scope.spawn(move || chop(client, server, id, json!({ "path": [i], "move": 1 })).0)
                })
                .into_iter()
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        assert_eq!(statuses.iter().filter(|s| **s == StatusCode::OK).count(), 1);
        assert_eq!(statuses.iter().filter(|s| **s == StatusCode::CONFLICT).count(), 1);
        let h: Value = client
            .get(server.api(&format!("/hydra/{id}/history")))
            .send()
            .unwrap()
            .json()
            .unwrap();
        assert_eq!(h["history"].as_array().unwrap().len(), 1);
    }
}

#[test]
fn goodstein_endpoint() {
    let dir = tempfile::tempdir().unwrap();
    let server = Server::start(dir.path());
    let client = Client::new();
    let v: Value = client
        .get(server.api("/goodstein?seed=3&steps=10"))
        .send()
        .unwrap()
        .json()
        .unwrap();
    assert_eq!(v["terminated"], true);
    assert_eq!(v["records"].as_array().unwrap().len(), 6);
    assert_eq!(v["records"][0]["ordinal"], "w + 1");

    for bad in ["/goodstein", "/goodstein?seed=x", "/goodstein?seed=3&steps=100000"] {
        let resp = client.get(server.api(bad)).send().unwrap();
        assert_eq!(resp.status(), StatusCode::BAD_REQUEST, "{bad}");
    }
}
