"""Wire-protocol conformance against the scripted fake plugin."""

from __future__ import annotations

import pytest

from calltide.errors import (
    ConfigurationError,
    PluginCrashed,
    PluginProtocolError,
    PluginTimeout,
)
from calltide.plugins import PluginClient, plugin_handshake, verify_plugin


class TestHandshake:
    def test_well_formed_hello(self, fake_plugin):
        handle = plugin_handshake(fake_plugin)
        assert handle.name == "fake-plugin"
        assert handle.version == "1"
        assert handle.max_tokens == 512
        assert handle.mode == "plugin"
        assert handle.wants == "raw"

    def test_malformed_hello(self, fake_plugin):
        with pytest.raises(PluginProtocolError):
            PluginClient(fake_plugin, args=["badhello"])

    def test_garbage_hello(self, fake_plugin):
        with pytest.raises(PluginProtocolError):
            PluginClient(fake_plugin, args=["garbage-hello"])

    def test_missing_executable(self, tmp_path):
        with pytest.raises(ConfigurationError):
            PluginClient(tmp_path / "nonexistent")


class TestRequests:
    def test_ordered_round_trips(self, fake_plugin):
        with PluginClient(fake_plugin) as client:
            for _ in range(5):
                label, scores = client.predict("any text")
                assert label == 2
                assert scores == (0.2, 0.2, 0.6)

    def test_crash_mid_session(self, fake_plugin):
        with PluginClient(fake_plugin, args=["crash"]) as client:
            client.predict("first works")
            with pytest.raises(PluginCrashed) as err:
                client.predict("second crashes")
        assert "synthetic crash" in str(err.value)

    def test_garbage_line(self, fake_plugin):
        with PluginClient(fake_plugin, args=["garbage"]) as client:
            client.predict("first works")
            with pytest.raises(PluginProtocolError):
                client.predict("second gets noise")

    def test_bad_scores(self, fake_plugin):
        with PluginClient(fake_plugin, args=["badscores"]) as client:
            with pytest.raises(PluginProtocolError):
                client.predict("scores sum to 1.5")

    def test_timeout(self, fake_plugin):
        with PluginClient(fake_plugin, args=["slow"], request_timeout=0.3) as client:
            with pytest.raises(PluginTimeout):
                client.predict("too slow")


class TestShutdown:
    def test_clean_exit(self, fake_plugin):
        client = PluginClient(fake_plugin)
        client.predict("one")
        assert client.shutdown() == 0

    def test_shutdown_idempotent(self, fake_plugin):
        client = PluginClient(fake_plugin)
        assert client.shutdown() == 0
        assert client.shutdown() == 0


class TestConformanceProbe:
    def test_conforming_plugin_passes(self, fake_plugin):
        handle = verify_plugin(fake_plugin)
        assert handle.name == "fake-plugin"

    def test_crashing_plugin_fails(self, fake_plugin, tmp_path):
        # wrap the fake in crash mode behind a shim so the probe launches it bare
        shim = tmp_path / "crashing"
        shim.write_text(f"#!/bin/sh\nexec {fake_plugin} crash\n")
        shim.chmod(0o755)
        with pytest.raises(PluginCrashed):
            verify_plugin(shim)

    def test_noisy_plugin_fails(self, fake_plugin, tmp_path):
        shim = tmp_path / "noisy"
        shim.write_text(f"#!/bin/sh\nexec {fake_plugin} garbage\n")
        shim.chmod(0o755)
        with pytest.raises(PluginProtocolError):
            verify_plugin(shim)
