namespace kf {}
