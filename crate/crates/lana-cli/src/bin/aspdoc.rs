fn main() {
    lana_cli::run(lana_cli::aspdoc_main)
}
