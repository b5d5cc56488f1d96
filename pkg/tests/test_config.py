import json
import os
import shutil
import tempfile
import unittest
from unittest import mock

from core import config as config_module
from core.config import config


class TestSettings(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        settings_file = os.path.join(self.tmp, "settings.json")
        self.patches = [
            mock.patch.object(config_module, "CONFIG_DIR", self.tmp),
            mock.patch.object(config_module, "SETTINGS_FILE", settings_file),
        ]
        for p in self.patches:
            p.start()

    def tearDown(self):
        for p in self.patches:
            p.stop()
        shutil.rmtree(self.tmp, ignore_errors=True)

    def test_missing_file_gives_empty_settings(self):
        self.assertEqual(config_module.load_settings(), {})

    def test_corrupt_file_gives_empty_settings(self):
        with open(config_module.SETTINGS_FILE, 'w') as f:
            f.write("{ nope")
        self.assertEqual(config_module.load_settings(), {})

    def test_non_object_or_undecodable_file_gives_empty_settings(self):
        for raw in (b"[1, 2]", b"\xff\xfe{}"):
            with open(config_module.SETTINGS_FILE, 'wb') as f:
                f.write(raw)
            self.assertEqual(config_module.load_settings(), {})

    def test_settings_file_is_read(self):
        with open(config_module.SETTINGS_FILE, 'w') as f:
            json.dump({"rng_seed": 99, "alpha_levels": 11}, f)
        self.assertEqual(config_module.load_settings(), {"rng_seed": 99, "alpha_levels": 11})

    def test_version_is_read(self):
        self.assertTrue(config.get_version().startswith("v"))


if __name__ == '__main__':
    unittest.main()
