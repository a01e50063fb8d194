from .synth import SynthConfig, synth, sample_centres, render_image
