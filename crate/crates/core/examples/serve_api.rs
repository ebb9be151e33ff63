// The HTTP API on an ephemeral port: list datasets, then ask for a Mapper
// graph and a diagram.

use std::collections::BTreeMap;

use tdakit::pipeline::Dataset;
use tdakit::pointcloud::PointCloud;
use tokio::io::{AsyncReadExt, AsyncWriteExt};

async fn request(addr: std::net::SocketAddr, method: &str, path: &str, body: &str) -> std::io::Result<String> {
    let mut stream = tokio::net::TcpStream::connect(addr).await?;
    let head = format!(
        "{method} {path} HTTP/1.1\r\nHost: localhost\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
        body.len()
    );
    stream.write_all(head.as_bytes()).await?;
    stream.write_all(body.as_bytes()).await?;
    let mut out = String::new();
    stream.read_to_string(&mut out).await?;
    Ok(out.split_once("\r\n\r\n").map(|(_, b)| b.to_string()).unwrap_or(out))
}

pub fn run() -> tdakit::Result<()> {
    let blob: Vec<Vec<f64>> = (0..20).map(|k| vec![(k % 5) as f64 * 0.1, (k / 5) as f64 * 0.1]).collect();
    let mut datasets = BTreeMap::new();
    datasets.insert("blob".to_string(), Dataset::PointCloud(PointCloud::new(blob)?));

    let rt = tokio::runtime::Builder::new_current_thread().enable_all().build()?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await?;
        let addr = listener.local_addr()?;
        tokio::spawn(async move { axum::serve(listener, tdakit::serve::router(datasets)).await });

        println!("GET /datasets → {}", request(addr, "GET", "/datasets", "").await?);
        let body = r#"{"dataset":"blob","lens":{"kind":"coordinate","axis":0},"resolution":1,"overlap":0.2,"clustering":{"method":"single_linkage","eps":0.5}}"#;
        println!("POST /mapper → {}", request(addr, "POST", "/mapper", body).await?);
        let bad = body.replace("0.2", "1.5");
        println!("POST /mapper (bad overlap) → {}", request(addr, "POST", "/mapper", &bad).await?);
        let pd = r#"{"dataset":"blob","filtration":{"type":"rips","max_scale":0.5}}"#;
        println!("POST /diagram → {} bytes", request(addr, "POST", "/diagram", pd).await?.len());
        Ok(())
    })
}

#[allow(dead_code)]
fn main() -> tdakit::Result<()> {
    run()
}
