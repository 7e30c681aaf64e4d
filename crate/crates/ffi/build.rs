use std::env;
use std::path::PathBuf;

use cbindgen::{Config, EnumConfig, Language, RenameRule};

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    let config = Config {
        language: Language::C,
        include_guard: Some("CHURCH_TRANSDUCERS_H".into()),
        cpp_compat: true,
        enumeration: EnumConfig { rename_variants: RenameRule::ScreamingSnakeCase, prefix_with_name: true, ..Default::default() },
        ..Default::default()
    };
    println!("cargo:rerun-if-changed=src/lib.rs");
    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("unable to generate bindings")
        .write_to_file(crate_dir.join("include/church_transducers.h"));
}
