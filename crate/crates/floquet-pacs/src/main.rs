fn main() {
    std::process::exit(floquet_pacs::run(std::env::args_os()));
}
