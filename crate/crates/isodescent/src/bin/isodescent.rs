fn main() {
    // Placeholder while the library takes shape; the real CLI lands with the
    // pipeline module.
    eprintln!("isodescent: command-line interface not wired up yet");
    std::process::exit(2);
}
