use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{Method, StatusCode, Uri};
use axum::response::{IntoResponse, Response as HttpResponse};
use axum::{Json, Router};
use tokio::net::TcpListener;

use crate::Service;

async fn dispatch(State(service): State<Arc<Service>>, method: Method, uri: Uri, body: Bytes) -> HttpResponse {
    let path = uri.path().to_string();
    // logic is CPU-bound and takes per-session locks; keep it off the reactor
    let result = tokio::task::spawn_blocking(move || service.handle(method.as_str(), &path, &body)).await;
    match result {
        Ok(r) => {
            let status = StatusCode::from_u16(r.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
            (status, Json(r.body)).into_response()
        }
        Err(e) => {
            (StatusCode::INTERNAL_SERVER_ERROR, Json(serde_json::json!({"error": e.to_string()}))).into_response()
        }
    }
}

/// Every request goes through [`Service::handle`].
pub fn router(service: Arc<Service>) -> Router {
    Router::new().fallback(dispatch).with_state(service)
}

pub async fn serve(listener: TcpListener, service: Arc<Service>) -> std::io::Result<()> {
    axum::serve(listener, router(service)).await
}
