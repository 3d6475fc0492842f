fn main() {
    std::process::exit(rgbd_lift::cli::run(std::env::args_os()));
}
