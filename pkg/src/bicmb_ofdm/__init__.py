"""Link-level simulation and diversity analysis of bit-interleaved coded
multiple beamforming over OFDM (BICMB-OFDM)."""

__version__ = "0.1.0"
