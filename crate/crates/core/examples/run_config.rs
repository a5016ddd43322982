use std::path::Path;

use fracwave::cli_io::{load_config, run};

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut config = load_config(&dir.join("fig2.conf")).expect("bundled config parses");
    config.output.dir = std::env::temp_dir().join("fracwave-fig2");
    print!("{config}");

    match run(&config, &dir) {
        Ok(report) => {
            for a in &report.artifacts {
                println!("wrote {}", config.output.dir.join(a).display());
            }
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
