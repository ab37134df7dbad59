fn main() {
    // Logging is fixed at warnings; the tool reads no environment variables.
    env_logger::Builder::new().filter_level(log::LevelFilter::Warn).init();
    std::process::exit(charge_tomo::cli::run(std::env::args_os()));
}
