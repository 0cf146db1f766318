import { issquare } from '../handlers.js';
import { serve } from '../protocol.js';

serve(issquare);
