//! HTTP facade of the seedforge workbench.
//!
//! Exposes the expansion models as an Expansion API (`/models`, `/expand`)
//! and the session loop the dashboard drives (`/sessions/...`). The
//! endpoint contract is documented in `openapi.yaml` next to this crate's
//! manifest.

mod error;
pub mod registry;
mod routes;
mod workbench;

pub use error::ApiError;
pub use registry::{merge_candidates, Backend, ModelDescriptor, ModelKind, ModelRegistry};
pub use routes::router;
pub use workbench::{
    DecisionBody, EntityBody, ExpandBody, HighlightBody, PatchEntityBody, SessionExpandBody,
    Workbench, MAX_K,
};

use std::future::Future;
use std::sync::Arc;

use tokio::net::TcpListener;

/// Serves `workbench` on an already bound listener until `shutdown` resolves.
pub async fn serve(
    listener: TcpListener,
    workbench: Arc<Workbench>,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(workbench))
        .with_graceful_shutdown(shutdown)
        .await
}
