from . import async_helper, config, error, misc, store, text, time, vectors

run_sync = async_helper.run_sync
run_timed = async_helper.run_timed
