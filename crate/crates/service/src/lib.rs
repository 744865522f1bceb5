//! HTTP JSON API over a loaded knowledge base.
//!
//! | method | path | |
//! |---|---|---|
//! | POST | `/api/query` | body `{"q": "..."}` |
//! | GET | `/api/ontology` | class forest, properties, instances |
//! | GET | `/api/classes/{name}/instances` | instances of a class and its subclasses |
//! | GET | `/api/instances/{name}` | one instance with its assertions |
//! | GET | `/api/perf?r=&n_min=&n_max=&steps=` | cost curve rows |
//! | GET | `/healthz` | liveness |
//!
//! Errors are returned as `{"error": {"code": ..., "message": ...}}`.
//! Query failures use `malformed_query` (400), `no_relation` (422),
//! `empty_result` (404) and `unknown_name` (404).

mod api;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::Router;
use ontosearch_core::{LoadError, SearchEngine};
use thiserror::Error;
use tokio::net::TcpListener;
use tower_http::services::ServeDir;

pub use api::ApiError;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub kb_dir: PathBuf,
    pub bind_address: String,
    /// Directory served at `/` for paths the API does not handle.
    pub static_dir: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum ServeError {
    #[error("loading {}: {source}", kb_dir.display())]
    Load {
        kb_dir: PathBuf,
        #[source]
        source: LoadError,
    },
    #[error("static directory {} does not exist", .0.display())]
    StaticDir(PathBuf),
    #[error("cannot bind {address}: {source}")]
    Bind {
        address: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// The application router for an already loaded engine.
pub fn router(engine: Arc<SearchEngine>, static_dir: Option<PathBuf>) -> Router {
    let api = api::api_routes(engine);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.fallback(api::not_found),
    }
}

/// A loaded engine bound to a listening socket.
pub struct Server {
    listener: TcpListener,
    app: Router,
}

impl Server {
    pub async fn bind(config: &ServiceConfig) -> Result<Self, ServeError> {
        let engine = SearchEngine::load(&config.kb_dir).map_err(|source| ServeError::Load {
            kb_dir: config.kb_dir.clone(),
            source,
        })?;
        if let Some(dir) = &config.static_dir {
            if !dir.is_dir() {
                return Err(ServeError::StaticDir(dir.clone()));
            }
        }
        let kb = engine.kb();
        tracing::info!(
            classes = kb.class_names().count(),
            properties = kb.properties().count(),
            instances = kb.instances().count(),
            "knowledge base loaded"
        );
        let listener = TcpListener::bind(&config.bind_address)
            .await
            .map_err(|source| ServeError::Bind {
                address: config.bind_address.clone(),
                source,
            })?;
        Ok(Server {
            listener,
            app: router(Arc::new(engine), config.static_dir.clone()),
        })
    }

    pub fn local_addr(&self) -> std::io::Result<SocketAddr> {
        self.listener.local_addr()
    }

    /// Serves until ctrl-c or SIGTERM.
    pub async fn run(self) -> Result<(), ServeError> {
        tracing::info!(address = %self.local_addr()?, "listening");
        axum::serve(self.listener, self.app)
            .with_graceful_shutdown(shutdown_signal())
            .await?;
        tracing::info!("shut down");
        Ok(())
    }
}

pub async fn serve(config: ServiceConfig) -> Result<(), ServeError> {
    Server::bind(&config).await?.run().await
}

async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let terminate = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending::<()>().await,
        }
    };
    #[cfg(not(unix))]
    let terminate = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {}
        _ = terminate => {}
    }
}
