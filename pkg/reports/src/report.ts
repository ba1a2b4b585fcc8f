#!/usr/bin/env node
// report.ts - executable entry point

import { hideBin } from "yargs/helpers";
import { runCli } from "./cli.js";

process.exit(await runCli(hideBin(process.argv)));
