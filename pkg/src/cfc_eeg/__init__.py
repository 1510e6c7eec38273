"""Wavelet cross-frequency-coupling features and QDA classification of EEG."""
