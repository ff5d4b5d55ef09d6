fn main() {
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").unwrap();
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    match cbindgen::generate(&crate_dir) {
        Ok(bindings) => {
            bindings.write_to_file(format!("{crate_dir}/include/arfkit.h"));
        }
        Err(e) => {
            // Keep the previously generated header usable instead of failing
            // builds that only touch unrelated crates.
            println!("cargo:warning=cbindgen failed: {e}");
        }
    }
}
