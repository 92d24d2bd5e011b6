#![allow(dead_code)]

use std::sync::Arc;

use reqwest::{Client, Method, Response};
use serde_json::Value;
use tempfile::TempDir;
use tokio::net::TcpListener;
use tokio::sync::oneshot;

use seedforge_core::{CategoryIndex, EmbeddingStore, SessionStore};
use seedforge_service::{serve, Backend, ModelRegistry, Workbench};
use seedforge_testkit::fixture;

pub const TOY_EMB: &str = "emb:toy_embeddings";
pub const TOY_KB: &str = "cat:kb_toy";

/// A live server on an ephemeral port, stopped when dropped.
pub struct TestServer {
    pub base: String,
    pub client: Client,
    pub workbench: Arc<Workbench>,
    pub data_dir: TempDir,
    stop: Option<oneshot::Sender<()>>,
}

impl Drop for TestServer {
    fn drop(&mut self) {
        if let Some(stop) = self.stop.take() {
            let _ = stop.send(());
        }
    }
}

pub fn toy_registry() -> ModelRegistry {
    let (store, _) = EmbeddingStore::load(fixture("toy_embeddings.txt")).unwrap();
    let kb = CategoryIndex::load(fixture("kb_toy.tsv")).unwrap();
    let mut registry = ModelRegistry::new();
    registry
        .register(TOY_EMB, Backend::Embedding(Arc::new(store)))
        .unwrap();
    registry
        .register(TOY_KB, Backend::Category(Arc::new(kb)))
        .unwrap();
    registry
}

pub async fn spawn(registry: ModelRegistry) -> TestServer {
    let data_dir = tempfile::tempdir().unwrap();
    spawn_in(registry, data_dir).await
}

pub async fn spawn_in(registry: ModelRegistry, data_dir: TempDir) -> TestServer {
    let store = SessionStore::open(data_dir.path()).unwrap();
    let workbench = Arc::new(Workbench::new(registry, store));
    let listener = TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    let (tx, rx) = oneshot::channel::<()>();
    tokio::spawn(serve(listener, workbench.clone(), async {
        let _ = rx.await;
    }));
    TestServer {
        base: format!("http://{addr}"),
        client: Client::new(),
        workbench,
        data_dir,
        stop: Some(tx),
    }
}

impl TestServer {
    pub fn url(&self, path: &str) -> String {
        format!("{}{}", self.base, path)
    }

    pub async fn send(&self, method: Method, path: &str, body: Option<Value>) -> Response {
        let mut req = self.client.request(method, self.url(path));
        if let Some(body) = body {
            req = req.json(&body);
        }
        req.send().await.unwrap()
    }

    /// Sends a request and returns (status, parsed JSON body).
    pub async fn call(&self, method: Method, path: &str, body: Option<Value>) -> (u16, Value) {
        let resp = self.send(method, path, body).await;
        let status = resp.status().as_u16();
        let text = resp.text().await.unwrap();
        let json = serde_json::from_str(&text)
            .unwrap_or_else(|e| panic!("non-JSON body for {path}: {e}: {text:?}"));
        (status, json)
    }

    pub async fn get(&self, path: &str) -> (u16, Value) {
        self.call(Method::GET, path, None).await
    }

    pub async fn post(&self, path: &str, body: Value) -> (u16, Value) {
        self.call(Method::POST, path, Some(body)).await
    }

    pub async fn post_raw(&self, path: &str, body: impl Into<reqwest::Body>) -> (u16, Value) {
        let resp = self
            .client
            .post(self.url(path))
            .body(body)
            .send()
            .await
            .unwrap();
        let status = resp.status().as_u16();
        (status, resp.json().await.unwrap())
    }

    pub async fn create_session(&self, name: &str) -> String {
        let (status, body) = self
            .post("/sessions", serde_json::json!({ "name": name }))
            .await;
        assert_eq!(status, 201, "{body}");
        body["id"].as_str().unwrap().to_owned()
    }
}

/// Asserts the uniform error shape and returns the error code.
pub fn error_code(status: u16, body: &Value, expected_status: u16) -> String {
    assert_eq!(status, expected_status, "unexpected status, body {body}");
    assert!(body["detail"].is_string(), "missing detail in {body}");
    body["error"]
        .as_str()
        .expect("missing error code")
        .to_owned()
}

pub fn surfaces(list: &Value) -> Vec<String> {
    list.as_array()
        .unwrap()
        .iter()
        .map(|c| c["surface"].as_str().unwrap().to_owned())
        .collect()
}
